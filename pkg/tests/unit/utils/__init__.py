"""
## Utilities (utils)

tests/unit/utils/test_utils.py
- run_async_safely with and without a running loop
- Secrets from environment variables
- Seed splitter and seeded uniforms
- Config path resolution
- Thread-safe session registry

tests/unit/utils/test_text.py
- Tokenizer offsets and sentence indices
- Content words and stemming
"""
