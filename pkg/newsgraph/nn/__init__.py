"""Dense neural-network core with hand-derived gradients."""
