"""Tests for GapLab."""
