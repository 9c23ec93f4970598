"""Tests for src.utils.errors: exit codes and payloads."""

import pytest

from src.utils.errors import (
    ConfigurationError, DomainError, EnsembleError, InfeasibleError, InsufficientDataError, LabError,
    NumericError, SchemaError, SchemaVersionError, StorageError, VerificationError,
)


@pytest.mark.parametrize("error, code", [
    (ConfigurationError("x"), 1),
    (DomainError("x"), 1),
    (SchemaError("x"), 1),
    (SchemaVersionError("x"), 1),
    (InfeasibleError(["x"]), 2),
    (EnsembleError("x"), 2),
    (InsufficientDataError("x"), 2),
    (NumericError("x"), 2),
    (VerificationError("x"), 2),
    (StorageError("x"), 2),
])
def test_exit_codes(error, code):
    assert isinstance(error, LabError)
    assert error.exit_code == code


def test_infeasible_lists_violations():
    error = InfeasibleError(["beta too small", "k0 too small"])
    assert error.violations == ["beta too small", "k0 too small"]
    assert "beta too small; k0 too small" in str(error)


def test_configuration_error_is_value_error():
    with pytest.raises(ValueError):
        raise ConfigurationError("bad")


def test_verification_witnesses():
    error = VerificationError("failed", [{"check": "lipschitz_f"}])
    assert error.witnesses == [{"check": "lipschitz_f"}]
