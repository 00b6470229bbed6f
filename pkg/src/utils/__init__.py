# Errors, decorators and numeric helpers
