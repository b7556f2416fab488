#!/usr/bin/env python3
"""Generate the bundled toy collaboration corpus (data/events_toy.jsonl).

The corpus is a deterministic function of SEED: a self-contained splitmix64
generator is used instead of the `random` module so the bytes do not depend
on the Python version. Authors are reused with a Polya-urn scheme (one
ticket per prior participation), which yields the heavy-tailed collaboration
counts the analysis pipeline expects; the author pool grows each year so
first-activity cohorts are spread across the corpus.
"""

import json
import os

SEED = 20250816
N_EVENTS = 10_000
FIRST_YEAR = 1950
N_YEARS = 8
INITIAL_AUTHORS = 1200
NEW_AUTHORS_PER_YEAR = 300

# event size -> probability (collaborations are small, occasionally large)
SIZE_PMF = [(1, 0.08), (2, 0.34), (3, 0.30), (4, 0.15),
            (5, 0.07), (6, 0.04), (7, 0.015), (8, 0.005)]

MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & MASK

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def unit(self):
        return (self.next() >> 11) * (2.0 ** -53)

    def below(self, n):
        return self.next() % n


def pick_size(rng):
    u = rng.unit()
    acc = 0.0
    for size, p in SIZE_PMF:
        acc += p
        if u < acc:
            return size
    return SIZE_PMF[-1][0]


def format_date(rng, year):
    u = rng.unit()
    if u < 0.50:
        return str(year)
    if u < 0.95:
        month = 1 + rng.below(12)
        day = 1 + rng.below(28)
        return f"{year}-{month:02d}-{day:02d}"
    return f"{year}.{rng.below(10)}"


def main():
    rng = SplitMix64(SEED)
    authors = [f"a{i:04d}" for i in range(INITIAL_AUTHORS)]
    tickets = list(range(INITIAL_AUTHORS))  # one birth ticket per author

    lines = []
    for i in range(N_EVENTS):
        year_idx = i * N_YEARS // N_EVENTS
        year = FIRST_YEAR + year_idx
        expected = INITIAL_AUTHORS + year_idx * NEW_AUTHORS_PER_YEAR
        while len(authors) < expected:
            authors.append(f"a{len(authors):04d}")
            tickets.append(len(authors) - 1)

        size = pick_size(rng)
        chosen = []
        attempts = 0
        while len(chosen) < size and attempts < 40 * size:
            attempts += 1
            idx = tickets[rng.below(len(tickets))]
            if idx not in chosen:
                chosen.append(idx)
        while len(chosen) < size:  # extremely small pools only
            idx = rng.below(len(authors))
            if idx not in chosen:
                chosen.append(idx)

        tickets.extend(chosen)  # urn reinforcement: rich get richer
        record = {
            "id": f"e{i:05d}",
            "date": format_date(rng, year),
            "participants": [authors[j] for j in sorted(chosen)],
        }
        lines.append(json.dumps(record, separators=(",", ":")))

    out_path = os.path.join(os.path.dirname(__file__), os.pardir,
                            "data", "events_toy.jsonl")
    out_path = os.path.normpath(out_path)
    os.makedirs(os.path.dirname(out_path), exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {len(lines)} events to {out_path}")


if __name__ == "__main__":
    main()
