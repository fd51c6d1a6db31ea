"""Core configuration, exceptions, solver retries and shared validation"""
