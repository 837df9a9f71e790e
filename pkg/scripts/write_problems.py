"""Regenerate problems/*.json from the built-in corpus."""
from pathlib import Path

from gradpoisson.corpus import CORPUS

out = Path(__file__).resolve().parent.parent / "problems"
out.mkdir(exist_ok=True)
for name, prob in sorted(CORPUS.items()):
    (out / f"{name}.json").write_text(prob.dumps(), encoding="utf-8")
    print(f"wrote {name}.json")
