"""Shared helpers for the demo scripts."""
from pathlib import Path

from firingmap import load_stimulus

DATA = Path(__file__).resolve().parent / "data"


def stimulus(name: str):
    return load_stimulus(DATA / f"{name}.json")


def banner(text: str) -> None:
    print()
    print(text)
    print("-" * len(text))
