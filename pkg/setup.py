from setuptools import setup, find_packages

with open('README.rst', encoding='utf8') as f:
    long_description = f.read()

setup(
    name='latticelin',
    packages=find_packages(exclude=('tests', 'tests.*', 'examples', 'examples.*')),
    version='1.0.0',
    description='Simulate and machine-check fully lattice linear self-stabilizing algorithms',
    long_description=long_description,
    long_description_content_type='text/x-rst',
    license='MIT',
    keywords=['self-stabilization', 'lattice linear', 'dominating set', 'stable marriage', 'distributed'],
    include_package_data=True,
    install_requires=['python-box', 'networkx', 'graphviz'],
    python_requires='>=3.8',
    entry_points={
        'console_scripts': ['latticelin = latticelin.cli:main']
    },
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'Topic :: System :: Distributed Computing',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: Implementation :: CPython',
        'Natural Language :: English'
    ]
)
