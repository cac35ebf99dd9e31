"""
Test suite for the colouring bijection toolkit.
"""
