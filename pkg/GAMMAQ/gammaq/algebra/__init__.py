# algebra package
