from typing import Dict, Iterable

from src.certifiers.records import CertificateRecord
from src.utils.logger import log_experiment, ActionType


class CertificateJudge:
    """
    CertificateJudge turns a batch of CertificateRecords into a structured
    decision usable by the pipeline and the CLI: SUCCESS iff no applicable
    record failed.
    """

    def __init__(self, agent_name: str = "CertificateJudge"):
        self.agent_name = agent_name

    # ─────────────────────────────────────────────────────────────
    # Counting
    # ─────────────────────────────────────────────────────────────
    @staticmethod
    def _tally(records: list[CertificateRecord]) -> Dict[str, int]:
        return {
            "passed": sum(1 for r in records if r.passed is True),
            "failed": sum(1 for r in records if r.passed is False),
            "not_applicable": sum(1 for r in records if r.passed is None),
        }

    # ─────────────────────────────────────────────────────────────
    # Main evaluation entry point
    # ─────────────────────────────────────────────────────────────
    def evaluate(self, suite: str, records: Iterable[CertificateRecord], method: str = "mixed") -> dict:
        """
        Evaluate one suite. A suite with zero applicable records is still a
        SUCCESS; the reason says so.
        """
        records = list(records)
        tally = self._tally(records)
        failed = [r for r in records if r.failed]

        if failed:
            decision = "FAILURE"
            worst = min(failed, key=lambda r: r.margin)
            reason = (
                f"{tally['failed']} of {len(records)} records failed; "
                f"worst: {worst.claim} with margin {worst.margin:.3e}"
            )
        elif tally["passed"] == 0:
            decision = "SUCCESS"
            reason = "No applicable records."
        else:
            decision = "SUCCESS"
            reason = f"All {tally['passed']} applicable records passed."

        report = {
            "agent": self.agent_name,
            "suite": suite,
            "decision": decision,
            "reason": reason,
            **tally,
            "failed_claims": [r.to_dict() for r in failed[:10]],
        }

        log_experiment(
            agent_name=self.agent_name,
            model_used=method,
            action=ActionType.CERTIFICATION,
            details={
                "input": {"suite": suite, "records": len(records)},
                "output": {k: report[k] for k in ("decision", "reason", "passed", "failed", "not_applicable")},
            },
            status="SUCCESS" if decision == "SUCCESS" else "FAILURE",
        )
        return report
