"""
## Core (core)

tests/unit/core/test_interface.py
- Enum values, Utterance validation, DialogueContext views
- SystemAction rendering and runtime-checkable backend protocols

tests/unit/core/test_handover.py
- Closed-class tagging and chunking
- Single pattern matches, including the reversed urgency order
- Contractions, and request words in ordinary speech
- Urgency, repeated human requests and the exception flag

tests/unit/core/test_cascade.py
- Modal vote with negative ties
- Agreement of a fair-coin classifier
- Rank order, exclusions and retries

tests/unit/core/test_itemize.py
- Verbatim narrative answers and their trial consistency
- Yes/no answers, skipped done fields, collected failures

tests/unit/core/test_report.py
- Case report JSON and snapshot hashes
- Session bookkeeping and NDJSON transcripts

tests/unit/core/test_engine.py
- Type confirmation, demotion and slot sync
- Question order
- Clarification cap, handovers, turn bound and backend failures
- Full cooperative call, determinism and concurrent steps

tests/unit/core/test_properties.py
- Fuzzed sessions end within the turn bound
- Added cues never lower a layer's support
- Trial order does not change narrative confidence
- Random case reports survive JSON
"""
