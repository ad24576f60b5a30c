""" Session store, package loader and library registry. """
