# Empty file to make the directory a Python package
