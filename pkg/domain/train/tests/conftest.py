import numpy as np
import pytest

from domain.train.definitions import Stage1Config, Stage2Config
from domain.train.tokenizer import Tokenizer

from .toy import TINY, toy_patches


@pytest.fixture(scope="module")
def dataset() -> np.ndarray:
    return toy_patches(12)


@pytest.fixture
def stage1() -> Stage1Config:
    return Stage1Config(epochs=2, batch_size=4, warmup_epochs=1, peak_lr=3e-3)


@pytest.fixture
def stage2() -> Stage2Config:
    return Stage2Config(epochs=2, batch_size=4, warmup_epochs=1)


@pytest.fixture
def frozen_tokenizer() -> Tokenizer:
    tokenizer = Tokenizer(TINY, np.random.default_rng(0))
    tokenizer.freeze()
    return tokenizer
