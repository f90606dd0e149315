"""Unit tests for dispatchengine, one package per source subpackage."""
