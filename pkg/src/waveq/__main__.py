"""Module entry point so ``python -m waveq`` behaves like the installed script."""

from .cli import main

main()
