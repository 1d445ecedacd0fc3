# Shared error and status types
