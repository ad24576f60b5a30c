""" Codecs exporting resources and importing RPC arguments. """
