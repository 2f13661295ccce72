"""Base model for the JSON reports printed by the command line."""

from typing import Any, Dict, Type

from pydantic import BaseModel


class Report(BaseModel):
    """Reports serialize with camelCase aliases and publish their schema.

    Optional fields are emitted as ``null``; the schema says so too, so every
    ``.json(by_alias=True)`` output validates against ``schema_json()``.
    """

    class Config:
        allow_population_by_field_name = True

        @staticmethod
        def schema_extra(schema: Dict[str, Any], model: Type["Report"]) -> None:
            properties = schema.get("properties", {})
            for field in model.__fields__.values():
                prop = properties.get(field.alias)
                if prop is None or not field.allow_none:
                    continue
                nullable = {"anyOf": [prop, {"type": "null"}]}
                if "title" in prop:
                    nullable["title"] = prop.pop("title")
                properties[field.alias] = nullable
