# race/race_settings.py
from dataclasses import dataclass


@dataclass
class RaceSettings:
    # --- Batch & determinism ---
    # ukuran batch tetap: stream per batch diturunkan dari (seed, batch_index),
    # jadi hasil tidak tergantung jumlah worker. JANGAN diubah antar versi.
    batch_cycles: int = 4096

    # --- Race ---
    # event yang dijalankan satu per satu sebelum sisa race ditarik sekaligus
    stepped_events_per_race: int = 64

    # --- Batas pengaman ---
    # batas event yang dijalankan satu per satu dalam satu cycle
    max_events_per_cycle: int = 10_000_000

    # --- Monte Carlo ---
    min_cycles: int = 1000
    max_pmf_bins: int = 20

    # --- Validasi analitik vs MC ---
    default_sigmas: float = 4.0


race_settings = RaceSettings()
