import os
import shutil
import tempfile

from freegig.distributions import FreeGigParams

# (lambda, alpha, beta)
SWEEP = [(2, 1, 1), (3, 2, 0.5), (1.5, 1, 2)]

MP_RATES = (0.5, 1.0, 2.0)


def sweep_params():
    return [FreeGigParams(*t) for t in SWEEP]


class temporary_directory(object):
    """A scratch directory removed on exit."""

    def __enter__(self):
        self.path = tempfile.mkdtemp(prefix='freegig-test-')
        return self.path

    def __exit__(self, exc_type, exc_val, exc_tb):
        shutil.rmtree(self.path, ignore_errors=True)
        return False


def read_bytes(*parts):
    with open(os.path.join(*parts), 'rb') as fp:
        return fp.read()
