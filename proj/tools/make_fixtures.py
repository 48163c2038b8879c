#!/usr/bin/env python3
"""Writes the synthetic 100 kb FASTA fixtures under tests/fixtures.

Each fixture comes from a seeded order-2 Markov chain with its own letter
bias, so the k-mer spectra differ between files. Rerunning reproduces the
checked-in files byte for byte.
"""
import pathlib
import random

LENGTH = 100_000
LINE = 70
ALPHABET = "ACGT"

# (name, seed, letter weights, lowercase)
FIXTURES = [
    ("fragment_balanced", 101, (1.0, 1.0, 1.0, 1.0), False),
    ("fragment_at_rich", 202, (1.6, 0.5, 0.5, 1.6), False),
    ("fragment_gc_rich", 303, (0.5, 1.7, 1.7, 0.5), False),
    ("fragment_cg_depleted", 404, (1.1, 1.0, 1.0, 1.1), True),
    ("fragment_repetitive", 505, (1.0, 0.8, 1.2, 1.0), False),
]


def transition_table(rng, weights, deplete_cg):
    table = {}
    for a in ALPHABET:
        for b in ALPHABET:
            row = [w * rng.uniform(0.3, 1.7) for w in weights]
            if deplete_cg and b == "C":
                row[ALPHABET.index("G")] *= 0.05
            total = sum(row)
            table[a + b] = [v / total for v in row]
    return table


def generate(name, seed, weights, lowercase):
    rng = random.Random(seed)
    table = transition_table(rng, weights, name == "fragment_cg_depleted")
    seq = [rng.choice(ALPHABET), rng.choice(ALPHABET)]
    while len(seq) < LENGTH:
        if name == "fragment_repetitive" and len(seq) > 500 and rng.random() < 0.002:
            # Copy an earlier stretch to plant long repeats.
            start = rng.randrange(0, len(seq) - 400)
            seq.extend(seq[start:start + rng.randrange(100, 400)])
            continue
        seq.append(rng.choices(ALPHABET, table[seq[-2] + seq[-1]])[0])
    text = "".join(seq[:LENGTH])
    if lowercase:
        text = text.lower()
    lines = [text[i:i + LINE] for i in range(0, LENGTH, LINE)]
    return f">{name} synthetic seed={seed} length={LENGTH}\n" + "\n".join(lines) + "\n"


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures"
    out.mkdir(parents=True, exist_ok=True)
    for name, seed, weights, lowercase in FIXTURES:
        (out / f"{name}.fa").write_text(generate(name, seed, weights, lowercase))


if __name__ == "__main__":
    main()
