"""
Entry point for python -m alexsim
"""

from alexsim.cli import main

if __name__ == "__main__":
    main()
