# Interface package initialization
