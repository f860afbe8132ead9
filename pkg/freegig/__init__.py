__version__ = '20201019'

if __name__ == '__main__':
    print(__version__)
