"""Tests for gaussons."""
