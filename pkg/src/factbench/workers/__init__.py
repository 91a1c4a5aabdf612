"""Bundled backend worker processes (SVM baseline and majority-class stub)."""
