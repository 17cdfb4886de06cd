from xmodel import JsonModel, Field


class Evidence(JsonModel):
    frames: list = Field(default=list)
    """ Hex of every frame the attacker observed or put on the air, in transmission order. """
    disclosed: dict = Field(default=dict)
    """
    Compromised or intruder-owned material, hex encoded, by category: `group_keys`,
    `sym_keys`, `private_keys` (DER) and `session_keys`.
    """
    derived_keys: list = Field(default=list)
    """ Session keys (hex) the attacker claims to hold. """
    findings: list = Field(default=list)

    @property
    def empty(self) -> bool:
        return not (self.derived_keys or self.findings)


class AttackOutcome(JsonModel):
    protocol: str
    script: str
    seed: int
    success: bool = False
    """ The attacker reached its goal. """
    goal_refs: list = Field(default=list)
    evidence: Evidence
    notes: list = Field(default=list)
