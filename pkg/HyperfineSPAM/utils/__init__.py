"""Utility modules shared by the HyperfineSPAM sub-packages."""
