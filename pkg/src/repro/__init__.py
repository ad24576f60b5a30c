""" Call records, console reconstruction and replay of sessions. """
