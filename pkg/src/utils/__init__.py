# Допоміжні утиліти
