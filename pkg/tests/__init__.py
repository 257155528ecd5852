"""Unit test package for HyperfineSPAM."""
