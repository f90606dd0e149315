"""
## Model backends (backends)

tests/unit/backends/test_base.py
- Single retry of backend calls
- Verbatim filter for extracted spans

tests/unit/backends/test_stub_classifier.py
- Cue and counter-cue logits, cascade masking
- Seeded trial noise

tests/unit/backends/test_stub_extractor.py
- Anchored spans, token windows and boundary jitter
- Spans stay substrings of random utterances

tests/unit/backends/test_api_backend.py
- Initialization and environment config
- Request bodies and response validation with a mocked service
"""
