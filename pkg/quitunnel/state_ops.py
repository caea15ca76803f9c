"""The particle statistics, state forms and series names understood throughout."""

from enum import Enum


class Statistics(Enum):
    """The exchange statistics of the two particles."""

    DISTINGUISHABLE: str = "distinguishable"
    """Two distinguishable particles ``A`` and ``B``."""
    BOSON: str = "boson"
    """Identical bosons, the upper sign of the double-sign expressions."""
    FERMION: str = "fermion"
    """Identical fermions, the lower sign of the double-sign expressions."""

    @property
    def sign(self) -> int:
        """The exchange sign: ``+1`` for bosons, ``-1`` for fermions and ``0`` for distinguishable particles."""
        match self:
            case Statistics.BOSON:
                return 1
            case Statistics.FERMION:
                return -1
        return 0

    @property
    def identical(self) -> bool:
        """Flag that indicates if the particles are identical."""
        return self is not Statistics.DISTINGUISHABLE


class StateForm(Enum):
    """The form of the two-particle input state."""

    PRODUCT_A: str = "product-a"
    """The product state of term ``a`` alone (``psi`` with ``phi``)."""
    PRODUCT_B: str = "product-b"
    """The product state of term ``b`` alone (``varphi`` with ``chi``)."""
    MIXTURE: str = "mixture"
    """The incoherent mixture of the two terms with weights ``|a|^2`` and ``|b|^2``."""
    SUPERPOSITION: str = "superposition"
    """The coherent superposition ``a |term a> + b |term b>``."""


class Term(Enum):
    """The two terms of the superposition."""

    A: str = "a"
    """Term ``a``, pairing ``psi`` (at ``p``) with ``phi`` (at ``q``)."""
    B: str = "b"
    """Term ``b``, pairing ``varphi`` (at ``pbar``) with ``chi`` (at ``qbar``)."""


class PacketLabel(Enum):
    """The identity of the four one-particle packets."""

    PSI: str = "psi"
    """First packet of term ``a``, central momentum ``p``."""
    PHI: str = "phi"
    """Second packet of term ``a``, central momentum ``q``."""
    VARPHI: str = "varphi"
    """First packet of term ``b``, central momentum ``pbar``."""
    CHI: str = "chi"
    """Second packet of term ``b``, central momentum ``qbar``."""


_FORM_TAGS: dict[StateForm, str] = {
    StateForm.PRODUCT_A: "a",
    StateForm.PRODUCT_B: "b",
    StateForm.MIXTURE: "mix",
    StateForm.SUPERPOSITION: "sup",
}


def series_name(statistics: Statistics, form: StateForm) -> str:
    """
    The stable column name of a probability series, e.g. ``P_dis_sup`` or ``P_ide_mix_fermion``.

    Args:
        statistics (Statistics): The particle statistics.
        form (StateForm): The state form.

    Returns:
        (str): The series name.
    """
    if statistics is Statistics.DISTINGUISHABLE:
        return f"P_dis_{_FORM_TAGS[form]}"
    return f"P_ide_{_FORM_TAGS[form]}_{statistics.value}"


def parse_series_name(name: str) -> tuple[Statistics, StateForm]:
    """
    Inverse of :func:`series_name`.

    Args:
        name (str): The series name.

    Returns:
        (tuple[Statistics, StateForm]): The statistics and form the series stands for.
    """
    for statistics in Statistics:
        for form in StateForm:
            if series_name(statistics, form) == name:
                return statistics, form
    raise KeyError(f"Unknown probability series: {name}")


ALL_SERIES: tuple[str, ...] = tuple(series_name(s, f) for s in Statistics for f in StateForm)
"""Every series name, in a stable order."""
