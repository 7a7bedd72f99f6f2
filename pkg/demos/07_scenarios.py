"""Bundled scenarios: scripted operation sequences with recorded, replayable outputs.

Run:  python3 demos/07_scenarios.py
The same runs are available from the shell as ``sflattice scenario run <name>``.
"""

from sflattice.cli import bundled_corpus, replay_transcript, run_scenario

for sc in bundled_corpus():
    tr = run_scenario(sc)
    checked = sum(s["checked"] for s in tr.steps)
    print(f"{sc.name:32} {len(tr.steps):2} steps, {checked:2} checked, "
          f"passed={tr.passed}, replays={replay_transcript(tr.to_json())}")
