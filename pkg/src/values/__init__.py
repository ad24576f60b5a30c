""" The value model, keys, paths and containers shared by all modules. """
