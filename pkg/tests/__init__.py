"""
Test suite for mdsconv
"""
