"""Regenerate the synthetic fixtures in fixtures/.

The real profile tables are not redistributable, so the fixtures are
uniform-mixture draws in the same schemas: twitter.csv (id, follower,
following), facebook_fans.csv (id, fans) and tencent.jsonl (id, follower).
About 1% of counts are zero, as in real profile listings.
"""

import json
from pathlib import Path

import numpy as np

from benfordnet.synth import synthetic_profiles, to_csv

OUT = Path(__file__).resolve().parent.parent / "fixtures"


def with_zeros(values, seed, share=0.01):
    rng = np.random.Generator(np.random.PCG64(seed))
    hit = rng.random(len(values)) < share
    return [0 if h else v for v, h in zip(values, hit.tolist())]


def main():
    OUT.mkdir(exist_ok=True)
    tw = synthetic_profiles(25_000, seed=20140709)
    tw["following"] = with_zeros(tw["following"], 1)
    tw["follower"] = with_zeros(tw["follower"], 2)
    (OUT / "twitter.csv").write_text(to_csv(tw))

    fb = synthetic_profiles(25_000, seed=3532700, follower_s_max=10**8)["follower"]
    (OUT / "facebook_fans.csv").write_text(to_csv({"fans": with_zeros(fb, 3)}))

    qq = synthetic_profiles(6095, seed=6095, follower_s_max=10**6)["follower"]
    with open(OUT / "tencent.jsonl", "w") as fh:
        for i, v in enumerate(qq):
            fh.write(json.dumps({"id": f"qq{i:05d}", "follower": v}) + "\n")


if __name__ == "__main__":
    main()
