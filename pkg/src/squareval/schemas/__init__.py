"""Bundled JSON Schemas for the config files the harness accepts."""
