module Geometry {
  trait HasArea {
    function Area(): real
  }

  trait HasName {
    function Name(): string
  }

  class Square extends HasArea, HasName {
    const side: real
    constructor(s: real) { side := s; }
    function Area(): real { side * side }
    function Name(): string { "square" }
  }

  method Report(sq: Square) returns (a: real)
  {
    a := sq.Area();
  }
}

module Util {
  function Abs(x: int): int { if x < 0 then -x else x }
}
