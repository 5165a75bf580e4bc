# Workflow package initialization
