"""Tests for bresselab."""
