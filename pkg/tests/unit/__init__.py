# Unit tests module
