# Agent package initialization
