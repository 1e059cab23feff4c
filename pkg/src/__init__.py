# MTJ Codesign - основний пакет
