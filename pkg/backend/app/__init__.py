# Fekete Lab backend package
