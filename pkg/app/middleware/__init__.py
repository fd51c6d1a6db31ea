"""Command error handling and logging"""
