# Exact solver package
