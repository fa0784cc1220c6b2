# Gordan superbridge app package
