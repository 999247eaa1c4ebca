# Commands package for rankin-bookkeeper
