"""
## Command line (cli)

tests/unit/cli/test_main.py
- check, session, emulate, metric and validate-config commands
- Exit codes for config errors
"""
