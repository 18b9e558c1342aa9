import pytest

from freemonad.field import FieldSpec
from freemonad.monad import euler, linesum, nullcorr


@pytest.fixture
def F():
    return FieldSpec.prime()


@pytest.fixture
def QQ():
    return FieldSpec.rational()


@pytest.fixture
def corpus():
    """The built-in corpus used across modules."""
    return {
        "euler3": euler(3),
        "euler4": euler(4),
        "euler5": euler(5),
        "nullcorr3": nullcorr(3),
        "nullcorr5": nullcorr(5),
        "linesum3": linesum([2, 0, -1], 3),
    }
