"""Test suite for Continuous-Variable Graph States (CVGS)"""
