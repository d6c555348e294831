import pytest

from csst import assign_all, default_schedule, gen_peaks, init_codebook_linear, train_batch


@pytest.fixture(scope="session")
def peaks():
    return gen_peaks(49)


@pytest.fixture(scope="session")
def peaks_init(peaks):
    return init_codebook_linear(peaks, 30, 30)


@pytest.fixture(scope="session")
def peaks_trained(peaks, peaks_init):
    return train_batch(peaks_init, peaks, default_schedule(30, 30))


@pytest.fixture(scope="session")
def peaks_assignment(peaks, peaks_trained):
    return assign_all(peaks_trained, peaks)
