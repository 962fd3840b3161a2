"""Tests for quota_trees."""
