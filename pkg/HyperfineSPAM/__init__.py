__author__ = 'HyperfineSPAM developers'
__version__ = '0.1.0'
