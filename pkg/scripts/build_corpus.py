"""Regenerate the synthetic corpus shipped in ``mealylearn/corpus``.

Shapes follow the BLE and MQTT subjects.  Generator arguments are stored in
the manifest so every file can be rebuilt and checked.
"""
import argparse
from pathlib import Path

from mealylearn.corpus import CORPUS_DIR, CorpusEntry, write_manifest
from mealylearn.dot import save_dot
from mealylearn.synth import ble_like, mqtt_like

# name, |Q|, |I|, seed
BLE = [
    ("CC2640R2-no-feature", 11, 8, 0),
    ("CC2640R2-no-pairing", 6, 8, 0),
    ("CC2650", 5, 9, 0),
    ("CC2652R1", 4, 7, 0),
    ("CYBLE-416045-02", 3, 9, 0),
    ("CYW43455", 4, 7, 1),
    ("nRF52832", 5, 9, 1),
]

# name, |Q|, generator keyword arguments
MQTT = [
    ("ActiveMQ", 18, dict(seed=1, n_twins=2, n_extra=1, p_self=0.5, p_hub=0.4)),
    ("emqtt", 18, dict(seed=0, n_twins=2, n_extra=2, p_self=0.5, p_hub=0.2)),
    ("HBMQTT", 17, dict(seed=9, n_twins=2, n_extra=0, p_self=0.5, p_hub=0.4, raw_states=18)),
    ("mosquitto", 18, dict(seed=1, n_twins=2, n_extra=2, p_self=0.5, p_hub=0.4)),
    ("VerneMQ", 17, dict(seed=123, n_twins=2, n_extra=2, p_self=0.5, p_hub=0.2)),
]


def build(root: Path) -> list:
    entries = []
    for name, q, i, seed in BLE:
        m = ble_like(q, i, seed=seed)
        path = f"ble/{name}.dot"
        entries.append(CorpusEntry(name, "ble", path, q, i, "synthetic",
                                   {"generator": "ble_like", "seed": seed}))
        (root / "ble").mkdir(parents=True, exist_ok=True)
        save_dot(m, root / path)
    for name, q, kw in MQTT:
        m = mqtt_like(q, 9, **kw)
        path = f"mqtt/{name}.dot"
        entries.append(CorpusEntry(name, "mqtt", path, q, 9, "synthetic",
                                   {"generator": "mqtt_like", **kw}))
        (root / "mqtt").mkdir(parents=True, exist_ok=True)
        save_dot(m, root / path)
    write_manifest(entries, root)
    return entries


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--root", type=Path, default=CORPUS_DIR)
    args = ap.parse_args()
    for e in build(args.root):
        print(f"{e.family:5} {e.name:22} |Q|={e.n_states:2} |I|={e.n_inputs}")
