"""Conic first-order methods: smoothed conic duals solved with optimal first-order variants"""
__version__ = "1.0.0"
