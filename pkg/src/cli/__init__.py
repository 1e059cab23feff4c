# Командний рядок
