"""
Test package for comove.
"""
