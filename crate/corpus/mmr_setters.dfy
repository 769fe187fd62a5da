class Counter {
  var low: int
  var high: int

  method SetLow(v: int)
    modifies this
  {
    low := v;
  }

  method SetHigh(v: int)
    modifies this
  {
    high := v;
  }

  method Reset()
    modifies this
  {
    SetLow(0);
    SetHigh(10);
  }
}
