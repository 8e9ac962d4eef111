"""JSON rendering of workflow payloads

Output is deterministic: fixed key order, floats written with repr, so two
runs with the same flags produce byte-identical files.
"""

import json
from typing import Any


def format_json(payload: dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def _residual(value: Any) -> str:  # noqa: ANN401
    return "-" if value is None else f"{value:.2e}"


def format_summary(tool: str, payload: dict[str, Any]) -> str:  # noqa: PLR0911
    """One line for the log"""
    if tool == "witness":
        if "sets" in payload:
            sizes = {k: len(v["points"]) for k, v in payload["sets"].items()}
            return f"witness collection m={payload['m']}: {sizes}"
        return f"witness set dims {payload['dims']}: {len(payload['points'])} point(s)"

    if tool == "decompose":
        sizes = payload["partition"]["sizes"]
        complete = payload.get("complete", False)
        return f"decompose: degree {payload['degree']}, blocks {sizes}, complete {complete}"

    if tool == "mtrace":
        if payload["branch"] == "pairs":
            pairs = ", ".join(
                f"{p['pair'][0]}/{p['pair'][1]}: {'ok' if p['passed'] else 'FAIL'}"
                f" ({_residual(p['residual'])})"
                for p in payload["pairs"]
            )
            return f"mtrace: complete {payload['complete']} [{pairs}]"
        return f"mtrace ({payload['branch']}): complete {payload['complete']}"

    if tool == "multidegree":
        return (
            f"multidegree {payload['multidegree']}, Segre degree {payload['segre_degree']}, "
            f"log-concave {payload['log_concave']}"
        )

    return f"{tool}: done"
