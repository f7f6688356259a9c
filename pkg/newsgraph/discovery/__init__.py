"""Link-scheme identification and the misinformation discovery pipeline."""
