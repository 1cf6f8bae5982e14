# File: lorec/storage/__init__.py
# Thin file-format layer. Each module reads/writes one kind of artifact and
# returns plain numpy arrays, dataclasses or pydantic models (no behaviour).
#
# Numerical modules never open files themselves; the commands go through here,
# so every on-disk format has a single place to change.
