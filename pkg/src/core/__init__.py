# Core bookkeeping modules for rankin-bookkeeper
