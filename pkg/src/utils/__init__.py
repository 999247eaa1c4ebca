# Utilities package for rankin-bookkeeper
