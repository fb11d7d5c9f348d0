"""Test suite for Agentic OS."""
