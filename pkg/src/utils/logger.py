import json
import os
import uuid
from datetime import datetime
from enum import Enum

from src.utils.config import get_settings


class ActionType(str, Enum):
    """
    Kinds of actions recorded in the experiment log.
    """
    GENERATION = "GRAPH_GEN"         # family generation, doubling, JSON load
    COMPUTATION = "COMPUTATION"      # eigensolves, enumerations, ball counts
    CERTIFICATION = "CERTIFICATION"  # CertificateRecord producers
    VALIDATION = "VALIDATION"        # standing-assumption checks
    IO = "IO"                        # report and table writes


# Actions that must describe what went in and what came out.
_REQUIRES_IO_KEYS = {ActionType.COMPUTATION, ActionType.CERTIFICATION}


def log_experiment(agent_name: str, model_used: str, action: ActionType, details: dict, status: str):
    """
    Append one entry to the experiment log.

    Args:
        agent_name (str): Component name (ex: "CheegerCertifier", "GraphGenerator").
        model_used (str): Numerical method used (ex: "dense-eigh", "enumeration").
        action (ActionType): The kind of action (use the ActionType enum).
        details (dict): Free-form details. COMPUTATION and CERTIFICATION entries
            MUST contain 'input' and 'output'.
        status (str): "SUCCESS", "FAILURE" or "SKIPPED".

    Raises:
        ValueError: If the action is unknown or required keys are missing.
    """
    valid_actions = [a.value for a in ActionType]
    if isinstance(action, ActionType):
        action_enum = action
    elif action in valid_actions:
        action_enum = ActionType(action)
    else:
        raise ValueError(f"❌ Invalid action: '{action}'. Use the ActionType enum (ex: ActionType.COMPUTATION).")

    if action_enum in _REQUIRES_IO_KEYS:
        missing_keys = [key for key in ("input", "output") if key not in details]
        if missing_keys:
            raise ValueError(
                f"❌ Logging error (component: {agent_name}): "
                f"fields {missing_keys} are missing from 'details'."
            )

    settings = get_settings()
    if not settings.log_enabled:
        return

    log_file = settings.log_file
    log_dir = os.path.dirname(log_file)
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)

    entry = {
        "id": str(uuid.uuid4()),
        "timestamp": datetime.now().isoformat(),
        "agent": agent_name,
        "model": model_used,
        "action": action_enum.value,
        "details": details,
        "status": status
    }

    data = []
    if os.path.exists(log_file):
        try:
            with open(log_file, 'r', encoding='utf-8') as f:
                content = f.read().strip()
                if content:
                    data = json.loads(content)
        except json.JSONDecodeError:
            print(f"⚠️ Log file {log_file} was corrupt. Starting a new list.")
            data = []

    data.append(entry)

    with open(log_file, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=4, ensure_ascii=False, default=str)
