# Argument validation and report serialization
