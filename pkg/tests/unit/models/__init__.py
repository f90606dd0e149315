"""
## Models (models)

tests/unit/models/test_phone_tree.py
- Shipped phone tree contents and lookups
- Invariant checks reporting every violation
- Loading from disk

tests/unit/models/test_config.py
- ConfidencePolicy defaults, bounds and turn bound
- Handover and stub config validation
- Inference response validation
"""
