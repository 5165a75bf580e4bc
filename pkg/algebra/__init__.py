# Exact algebra package
