"""
## Emulation harness (emulation)

tests/unit/emulation/test_scenario.py
- Scenario file loading and validation
- Seeded segment sampling and composed utterances

tests/unit/emulation/test_harness.py
- Scripted caller replies
- Saved turns of emulated calls and the worker pool
- One run per distinct opening; mean saved turns by size over the suite
- Shift and control replays, confidence curves and CSV output

tests/unit/emulation/test_plotting.py
- Saved-turns and confidence-curve figures
"""
