//! Book chapters as doc-tests (populated with the guide).
