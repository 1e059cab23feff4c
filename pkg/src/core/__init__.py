# Основна логіка програми
