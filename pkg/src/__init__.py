"""hankel-symbol-lab: Hankel symbols, Carleson measures and reflection positivity checks."""
