"""
Configuratie classes voor training en synthetische corpora
"""
from dataclasses import asdict, dataclass, field, fields, replace
from enum import Enum
from typing import Optional


class ModelDefaults:
    """
    Standaard waardes voor alle hyperparameters

    De objective gewichten, K en tau volgen het Instagram protocol;
    de dimensies zijn gekozen voor desk-scale runs.
    """

    # objective
    LAMBDA1 = 1e-4       # energy term
    LAMBDA2 = 0.01       # graph reconstructie
    LAMBDA3 = 1e-9       # singularity penalty
    N_COMPONENTS = 5     # K
    TAU = 0.65           # top 35% energie = bullying
    COVARIANCE_JITTER = 1e-6

    # dimensies
    EMBEDDING_DIM = 32
    WORD_HIDDEN = 32
    COMMENT_HIDDEN = 32
    SOCIAL_DIM = 8
    GRAPH_HIDDEN = 32
    GRAPH_DIM = 16
    MEMBERSHIP_HIDDEN = 10
    TEMPORAL_HIDDEN = 16

    # truncatie
    MAX_WORDS = 64
    MAX_COMMENTS = 128

    # optimizer
    LEARNING_RATE = 1e-3
    BATCH_SIZE = 32
    EPOCHS = 50
    ADAM_BETA1 = 0.9
    ADAM_BETA2 = 0.999
    ADAM_EPS = 1e-8

    # protocol
    TRAIN_FRACTION = 0.8
    N_RUNS = 10
    KMEANS_RESTARTS = 50


class AblationVariant(Enum):
    """Ablatie varianten van het model"""
    NO_TEXT = "UCDXtext"
    NO_TIME = "UCDXtime"
    NO_GRAPH = "UCDXgraph"

    @classmethod
    def parse(cls, value) -> Optional["AblationVariant"]:
        """Parse een variant naam (None of 'UCD' = volledig model)"""
        if value is None or isinstance(value, AblationVariant):
            return value
        text = str(value).strip()
        if text == "" or text.upper() == "UCD":
            return None
        for variant in cls:
            if variant.value.lower() == text.lower() or variant.name.lower() == text.lower():
                return variant
        raise ValueError(f"Unknown ablation variant: {value!r}")


class ThresholdMode(Enum):
    """Waar de tau-quantile op berekend wordt"""
    TEST_QUANTILE = "test_quantile"
    TRAIN_QUANTILE = "train_quantile"


@dataclass(frozen=True)
class Ablations:
    """Welke onderdelen uit staan"""
    no_text: bool = False
    no_time: bool = False
    no_graph: bool = False

    @classmethod
    def for_variant(cls, variant: Optional[AblationVariant]) -> "Ablations":
        """Ablation flags die bij een variant horen"""
        return cls(
            no_text=variant is AblationVariant.NO_TEXT,
            no_time=variant is AblationVariant.NO_TIME,
            no_graph=variant is AblationVariant.NO_GRAPH,
        )


@dataclass(frozen=True)
class TrainConfig:
    """
    Alle hyperparameters van een training run

    Attributes:
        lambda1: Gewicht van de energy term
        lambda2: Gewicht van de graph reconstructie term
        lambda3: Gewicht van de singularity penalty
        n_components: Aantal mixture componenten K
        tau: Energie threshold quantile in (0, 1)
        threshold_mode: Quantile over test energieen (standaard) of training energieen
        batch_size: Batch grootte N
        epochs: Aantal epochs
        seed: Enige bron van randomness
        ablations: Uitgeschakelde onderdelen
        variant: Naam van de ablatie variant (None = volledig model)
    """
    lambda1: float = ModelDefaults.LAMBDA1
    lambda2: float = ModelDefaults.LAMBDA2
    lambda3: float = ModelDefaults.LAMBDA3
    n_components: int = ModelDefaults.N_COMPONENTS
    tau: float = ModelDefaults.TAU
    threshold_mode: ThresholdMode = ThresholdMode.TEST_QUANTILE
    covariance_jitter: float = ModelDefaults.COVARIANCE_JITTER

    embedding_dim: int = ModelDefaults.EMBEDDING_DIM
    word_hidden: int = ModelDefaults.WORD_HIDDEN
    comment_hidden: int = ModelDefaults.COMMENT_HIDDEN
    social_dim: int = ModelDefaults.SOCIAL_DIM
    graph_hidden: int = ModelDefaults.GRAPH_HIDDEN
    graph_dim: int = ModelDefaults.GRAPH_DIM
    membership_hidden: int = ModelDefaults.MEMBERSHIP_HIDDEN
    temporal_hidden: int = ModelDefaults.TEMPORAL_HIDDEN
    max_words: int = ModelDefaults.MAX_WORDS
    max_comments: int = ModelDefaults.MAX_COMMENTS

    learning_rate: float = ModelDefaults.LEARNING_RATE
    batch_size: int = ModelDefaults.BATCH_SIZE
    epochs: int = ModelDefaults.EPOCHS
    adam_beta1: float = ModelDefaults.ADAM_BETA1
    adam_beta2: float = ModelDefaults.ADAM_BETA2
    adam_eps: float = ModelDefaults.ADAM_EPS

    seed: int = 0
    train_fraction: float = ModelDefaults.TRAIN_FRACTION
    min_token_freq: int = 1
    ablations: Ablations = field(default_factory=Ablations)
    variant: Optional[AblationVariant] = None

    @property
    def K(self) -> int:
        """Alias voor n_components"""
        return self.n_components

    def representation_dim(self) -> int:
        """Lengte d van ss = [z, v, p] onder de huidige ablaties"""
        d = self.social_dim
        if not self.ablations.no_text:
            d += 2 * self.comment_hidden
        if not self.ablations.no_graph:
            d += self.graph_dim
        return d

    def with_variant(self, variant) -> "TrainConfig":
        """Kopie met de ablatie flags van een variant (None = volledig model)"""
        variant = AblationVariant.parse(variant)
        return replace(self, ablations=Ablations.for_variant(variant), variant=variant)

    def with_overrides(self, **overrides) -> "TrainConfig":
        """Kopie met aangepaste velden (None waardes worden genegeerd)"""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_dict(self) -> dict:
        """Platte dict voor manifests en checkpoints"""
        data = asdict(self)
        data["threshold_mode"] = self.threshold_mode.value
        data["variant"] = self.variant.value if self.variant else None
        data["ablations"] = asdict(self.ablations)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "TrainConfig":
        """
        Maak een config uit een dict

        Raises:
            KeyError: Bij een onbekende key
        """
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise KeyError(f"Unknown config keys: {sorted(unknown)}")
        values = dict(data)
        if "threshold_mode" in values:
            values["threshold_mode"] = ThresholdMode(values["threshold_mode"])
        if "variant" in values:
            values["variant"] = AblationVariant.parse(values["variant"])
        if "ablations" in values and isinstance(values["ablations"], dict):
            values["ablations"] = Ablations(**values["ablations"])
        return cls(**values)


@dataclass(frozen=True)
class SynthSpec:
    """
    Parameters van de synthetische corpus generator

    Attributes:
        n_sessions: Aantal sessies
        bully_fraction: Fractie bullying sessies (minderheid, < 0.5)
        vocab_size: Totaal aantal woorden
        profane_vocab_size: Aantal scheldwoorden daarvan
        profane_rate_bully: Kans op een scheldwoord per token in bullying sessies
        profane_rate_clean: Idem in clean sessies
        burst_rate_ratio: Factor waarmee de gemiddelde gap in bullying sessies krimpt
        n_users: Aantal users in de graph
        homophily: Fractie edges binnen een blok
        seed: Random seed
    """
    n_sessions: int = 1000
    bully_fraction: float = 0.3
    vocab_size: int = 500
    profane_vocab_size: int = 40
    profane_rate_bully: float = 0.15
    profane_rate_clean: float = 0.01
    burst_rate_ratio: float = 4.0
    n_users: int = 200
    homophily: float = 0.9
    seed: int = 0

    clean_mean_gap: float = 60.0
    min_comments: int = 5
    max_comments: int = 20
    min_words: int = 3
    max_words: int = 12
    mean_degree: float = 8.0
    mean_likes: float = 40.0
    mean_shares: float = 4.0

    def to_dict(self) -> dict:
        """Platte dict voor manifests"""
        return asdict(self)
