"""
Test package for Pydantic-AI Multi-Agent System.
"""
