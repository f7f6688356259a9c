"""Classification metrics, annotator agreement, and experiment orchestration."""
