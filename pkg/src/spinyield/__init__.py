"""Radical-pair singlet yields and their dark-state decomposition."""
__version__ = "0.1.0"
