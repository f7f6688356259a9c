"""Flat classifiers over per-domain feature vectors."""
