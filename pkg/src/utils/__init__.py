""" Utility functions and other code. """
