"""
decflow entry point.

    python app.py invariants --mesh torus:equilateral:16 --trials 1000 --seed 7
    python app.py converge --problem tg2d --family B --resolutions 8,16,32,64
    python app.py mesh-audit --mesh torus:perturbed:32:0.15 --seed 3

See INTERFACES.md for every subcommand, flag and file schema.
"""

# Load environment variables from .env file before settings are read
from dotenv import load_dotenv
load_dotenv()

from cli import main

if __name__ == '__main__':
    main()
