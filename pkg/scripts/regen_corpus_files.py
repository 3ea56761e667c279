#!/usr/bin/env python3
"""Rewrite the bundled corpus JSON files from their builder functions.

Run after changing any builder in decompgame.corpus; a test asserts the
files and builders stay in sync.
"""

from __future__ import annotations

from decompgame import corpus
from decompgame.io import load_model, save_model


def main() -> None:
    corpus.DATA_DIR.mkdir(parents=True, exist_ok=True)
    for name in corpus.names():
        model = corpus.get(name)
        path = corpus.data_path(name)
        text = save_model(model)
        assert load_model(text) == model, f"{name}: round-trip drift"
        path.write_text(text, encoding="utf-8")
        print(f"wrote {path} ({len(text)} bytes)")


if __name__ == "__main__":
    main()
