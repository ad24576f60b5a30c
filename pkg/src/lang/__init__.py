""" Lexer, parser, evaluator and builtins of the embedded language. """
