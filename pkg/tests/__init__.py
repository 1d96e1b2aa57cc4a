"""
Test suite initialization
"""
