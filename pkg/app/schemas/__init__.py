# Pydantic Schemas Package
