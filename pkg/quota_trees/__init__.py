"""quota_trees package."""
