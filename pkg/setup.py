import os
try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup


install_requires = ['numpy >= 1.20',
                    'pandas >= 1.5.0',
                    'gmpy2 >= 2.1.0',
                    'mpmath >= 1.2',
                    'sympy >= 1.12']


version = '0.1.0'


def long_description():
    if os.path.exists('README.md'):
        return open('README.md').read()
    return ''


setup(name='cubiclab',
      version=version,
      description='Pure cubic fields Q(cbrt(8b^3 + 3)), Mordell curves and unramified quadratic extensions',
      package_dir={'cubiclab': 'cubiclab',
                   'cubiclab.logger': 'cubiclab/logger',
                   'cubiclab.scheduler': 'cubiclab/scheduler'
                   },
      packages=['cubiclab', 'cubiclab.logger', 'cubiclab.scheduler'],
      package_data={'cubiclab': ['data/annotations.json']},
      long_description=long_description(),
      long_description_content_type='text/markdown',
      python_requires='>=3.9',
      setup_requires=['setuptools>=18.0'],
      install_requires=install_requires,
      extras_require={'dev': ['pytest >= 7.0']},
      entry_points={'console_scripts': ['cubiclab = cubiclab.cli:main']},
      include_package_data=True)
